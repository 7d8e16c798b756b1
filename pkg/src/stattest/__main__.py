"""Run the command line interface with `python -m stattest`."""

import sys

from ._cli import main

sys.exit(main())
