import sys

from qcournot.cli import main

sys.exit(main())
