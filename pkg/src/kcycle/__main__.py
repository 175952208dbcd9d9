import sys

from kcycle.cli import main

sys.exit(main())
