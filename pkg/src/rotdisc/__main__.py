import sys

from rotdisc.cli import main

sys.exit(main())
