import os
import logging
from logging.handlers import RotatingFileHandler

from dotenv import load_dotenv
from .config import BasicConfig

# Load envs
load_dotenv()

# Set up config
config = BasicConfig()

# Make sure the logs folder exists
log_dir = config.LOG_DIR
os.makedirs(log_dir, exist_ok=True)

# File handler: rotating, 10 MB per file, keep 5 backups
file_handler = RotatingFileHandler(
    filename=os.path.join(log_dir, "galerkin.log"),
    maxBytes=10 * 1024 * 1024,
    backupCount=5,
    encoding="utf-8",
)

# Terminal handler: stderr, so JSON printed on stdout stays clean
stream_handler = logging.StreamHandler()

# Shared format
formatter = logging.Formatter(
    "[%(asctime)s] [%(process)d] [%(levelname)s] %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S %z",
)
file_handler.setFormatter(formatter)
stream_handler.setFormatter(formatter)

# Root logger
logging.basicConfig(
    handlers=[file_handler, stream_handler],
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
)

logger = logging.getLogger()
