"""Entry point for python -m aggreason."""

from aggreason.cli import app

if __name__ == "__main__":
    app()
