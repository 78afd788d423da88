# fracspec/__main__.py

import sys

from fracspec.main import main

sys.exit(main())
