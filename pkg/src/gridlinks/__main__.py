import sys

from gridlinks.cli import main

sys.exit(main())
