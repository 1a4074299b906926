"""Command-line interface, system-file format and report rendering."""

from .fileformat import SystemFile, SystemFileError, dumps, load, loads
from .main import main, run

__all__ = ["SystemFile", "SystemFileError", "dumps", "load", "loads", "main", "run"]
