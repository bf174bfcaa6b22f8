import logging
import os
import sys
from pathlib import Path

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(name, relative_log_folder, log_file, level=logging.INFO):
    """Return a logger writing to <project>/<relative_log_folder>/<log_file> and warnings to the console.

    MERA_LOG_DIR overrides the folder and MERA_LOG_LEVEL the file level.
    """
    base_dir = project_dir
    log_folder = base_dir / os.environ.get('MERA_LOG_DIR', relative_log_folder)
    log_folder.mkdir(parents=True, exist_ok=True)

    log_path = log_folder / log_file

    env_level = os.environ.get('MERA_LOG_LEVEL')
    if env_level:
        level = logging.getLevelName(env_level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.hasHandlers():
        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.WARNING)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    return logger
