"""Entry point for `python -m zrt`."""

from .cli import main

raise SystemExit(main())
