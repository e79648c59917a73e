import sys

from orbit.cli import main

sys.exit(main())
