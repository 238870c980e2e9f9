"""
Configuration settings for the q-Onsager verification toolkit
"""
import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    """Application configuration"""

    # App Settings
    LOG_LEVEL = os.getenv("QONSAGER_LOG_LEVEL", "WARNING").upper()

    # Rewriting engine guard; diagnostics only, never changes a successful result
    STEP_BOUND = int(os.getenv("QONSAGER_STEP_BOUND", "2000000"))

    # Report Settings (fixed, report content must not depend on the environment)
    SCHEMA_VERSION = 1
    OUTPUT_FORMATS = ["json", "text", "latex"]
    DEFAULT_WORKERS = 1
    TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "templates")

    # Engine gates
    GATE_SEED = 20130
    STRESS_SAMPLES = 50          # per defining relation, 8 relations per pair
    STRESS_MAX_LEN = 2           # |x|, |y| in x * r * y
    STRESS_MIN_INSTANCES = 250
    NECESSITY_POINTS = 5
    NECESSITY_SEED = 7

    # Numeric display
    NUMERIC_TOLERANCE = 1e-10
