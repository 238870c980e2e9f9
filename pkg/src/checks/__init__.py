"""
Check jobs run by the command-line front end
"""
