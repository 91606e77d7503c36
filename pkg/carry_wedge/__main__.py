"""Allow ``python -m carry_wedge``."""

import sys

from .cli import main

sys.exit(main())
