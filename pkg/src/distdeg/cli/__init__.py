"""Instance files, reports and the command line."""

from .instance import InstanceFile, LatticeProblem, parse, parse_text, render_instance
from .main import main, run

__all__ = ["InstanceFile", "LatticeProblem", "main", "parse", "parse_text", "render_instance", "run"]
