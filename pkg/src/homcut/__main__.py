import sys

from homcut.cli import main

sys.exit(main())
