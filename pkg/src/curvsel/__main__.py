import sys

from curvsel.cli import main

sys.exit(main())
