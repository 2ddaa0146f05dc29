"""
Command dispatcher and sampling configuration for the polarise script.
"""
from src.cli.commands import (COMMANDS, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE, Report,
                              run)
from src.cli.config import SamplingConfig
