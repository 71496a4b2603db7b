import sys

from kwcomplex.cli import main

sys.exit(main())
