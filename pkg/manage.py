#!/usr/bin/env python3
"""
Entry point for the zappa toolkit.

Usage:
  python manage.py construct --family l2 --m 8 --s 3 --t 1
  python manage.py verify --family m3 --p 3 --m 9 --r 1 --lambda 1 --all-claims
  python manage.py search --family l2 --m-max 16 --store
  python manage.py runs
"""

import os
import sys

# Ensure zappa can be imported
sys.path.insert(0, os.path.dirname(__file__))

from zappa.cli import main


if __name__ == "__main__":
    main()
