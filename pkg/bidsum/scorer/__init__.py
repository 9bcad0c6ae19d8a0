# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php

from bidsum.scorer.base import *
from bidsum.scorer.linear import *
from bidsum.scorer.encoder import *
from bidsum.scorer.bench import *
from bidsum.scorer.train import *
