# fracspec/utils/logger.py

import logging
from logging.handlers import RotatingFileHandler

from .config import settings

# Configure logger
log_formatter = logging.Formatter('[%(asctime)s] - %(levelname)s - %(message)s')
log_file = settings.LOG_FILE

file_handler = RotatingFileHandler(log_file, maxBytes=5 * 1024 * 1024, backupCount=5)
file_handler.setFormatter(log_formatter)
file_handler.setLevel(settings.LOG_LEVEL)

logger = logging.getLogger("fracspec")
logger.setLevel(settings.LOG_LEVEL)
logger.addHandler(file_handler)
