import sys

from abring.cli import main

sys.exit(main())
