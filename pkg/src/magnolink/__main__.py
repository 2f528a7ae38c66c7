import sys

from magnolink.cli import main

sys.exit(main())
