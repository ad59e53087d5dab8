import sys

from strutskit.cli import main

sys.exit(main())
