"""
socodes entry point

    python main.py tables --which 2
    python main.py code rm --r 1 --m 3 | python main.py check --expect-so
"""
import sys

from src.cli import run


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
