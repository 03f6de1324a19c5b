"""
Permutation polynomial toolkit - command-line application

Exact tests, known families and exhaustive classification of permutation
polynomials over finite fields. Run `python app.py --help` for the subcommands.
"""
import sys
from pathlib import Path

# Add the current directory to Python path for imports
sys.path.append(str(Path(__file__).parent))

from cli.commands import main


if __name__ == "__main__":
    main()
