from __future__ import annotations

import sys

from dimquot.cli import main

sys.exit(main())
