import sys

from xy_disentangler.cli import main

sys.exit(main())
