# gini_main.py - Entry point for the command line
#!/usr/bin/env python3
"""
Fat-Tail Gini Toolkit command line
Run with: python gini_main.py <command> [options]   (python gini_main.py list)
"""

import sys
import logging
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables early, before settings are read
load_dotenv()

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from config.settings import settings

# Logs go to stderr; stdout carries results only
logging.basicConfig(
    level=settings.log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stderr)]
)
logger = logging.getLogger(__name__)

# Import tools to trigger registration
import tools  # noqa: E402,F401

from interfaces.cli import main

if __name__ == "__main__":
    sys.exit(main())
