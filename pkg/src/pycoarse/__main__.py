import sys
from pycoarse.cli import main

sys.exit(main())
