import sys

from hopboltz.cli import main

sys.exit(main())
