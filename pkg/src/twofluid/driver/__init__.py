"""Configuration, scenarios, output files and command line."""
