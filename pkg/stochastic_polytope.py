#!/usr/bin/env python3
"""Main entry point for the stochastic-polytope tool."""

import sys

from stochastic_polytope.cli import main

if __name__ == "__main__":
    sys.exit(main())
