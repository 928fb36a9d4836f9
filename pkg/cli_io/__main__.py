"""
``python -m cli_io <subcommand> ...``
"""

from cli_io.cli import main

if __name__ == '__main__':
    main()
