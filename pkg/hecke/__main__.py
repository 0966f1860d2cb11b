import sys

from hecke.cli import main

sys.exit(main())
