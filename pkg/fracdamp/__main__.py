"""Entry point for: python -m fracdamp"""

import sys

from fracdamp.cli import main

sys.exit(main())
