import sys

from swarmtwin.cli import main

sys.exit(main())
