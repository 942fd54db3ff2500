import sys

from fidepia.cli import main

sys.exit(main())
