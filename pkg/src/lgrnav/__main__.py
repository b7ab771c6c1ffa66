import sys

from lgrnav.cli import main

sys.exit(main())
