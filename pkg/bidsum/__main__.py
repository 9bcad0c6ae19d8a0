# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
import sys

from bidsum.cli import main

if __name__ == "__main__":
    sys.exit(main())
