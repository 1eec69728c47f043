"""Main entry point for the worm-bergman command line."""

import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from cli.app import main

if __name__ == "__main__":
    sys.exit(main())
