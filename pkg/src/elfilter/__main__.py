import sys

from elfilter.cli import main

sys.exit(main())
