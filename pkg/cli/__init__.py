# cli/__init__.py
"""
cli
===
File-based front end: `netobs check|augment|verify|demo`.

Public API
----------
main               — argparse dispatcher, returns the process exit code
parse_system       — read a system file into a SystemSpec
load_system_file   — same, keeping name, cost unit, seed and expected values
dump_system        — write a SystemSpec back as a system file
"""

from .app import main
from .system_file import SystemFile, dump_system, load_system_file, parse_system, spec_to_dict

__all__ = [
    'main',
    'SystemFile',
    'parse_system',
    'load_system_file',
    'dump_system',
    'spec_to_dict',
]

__version__ = '0.1.0'
