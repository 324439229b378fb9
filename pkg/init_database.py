#!/usr/bin/env python3
"""
Run archive initialization script.
Run this from the project root to recreate the archive and seed the reference run.
"""

from database.init_db import main

if __name__ == "__main__":
    main()
