import sys

from vohd.cli import main

sys.exit(main())
