import sys

from dinc.cli import main

sys.exit(main())
