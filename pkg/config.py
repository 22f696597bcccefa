import logging
import os
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Matcher and benchmark configuration"""

    # Logging
    LOG_LEVEL = os.getenv('ELB_LOG_LEVEL', 'INFO')

    # Output
    OUTPUT_DIR = os.getenv('ELB_OUTPUT_DIR', 'output')

    # Bench parallelism (processes)
    THREADS = os.getenv('ELB_THREADS', '1')

    # Experiment defaults
    BLOCK_RATIO = float(os.getenv('ELB_BLOCK_RATIO', 0.05))
    THRESHOLD_RATIO = float(os.getenv('ELB_THRESHOLD_RATIO', 0.2))
    OCCURRENCE_PROBABILITY = float(os.getenv('ELB_OCCURRENCE_PROBABILITY', 1e-4))
    SEED = int(os.getenv('ELB_SEED', 1))
    REPS = int(os.getenv('ELB_REPS', 3))
    STREAM_LENGTH = int(os.getenv('ELB_STREAM_LENGTH', 100000))

    # Relative widening of block bounds against rounding
    ROUNDING_SLACK = float(os.getenv('ELB_ROUNDING_SLACK', 1e-9))

    # Generator identity written into sidecars
    GENERATOR = 'numpy.PCG64'

    @staticmethod
    def threads():
        """Bench worker count, at least 1"""
        try:
            threads = int(Config.THREADS)
        except (TypeError, ValueError):
            logger.warning("Invalid ELB_THREADS=%r, using 1", Config.THREADS)
            return 1
        if threads < 1:
            logger.warning("ELB_THREADS must be >= 1, got %d, using 1", threads)
            return 1
        return threads

    @staticmethod
    def init_dirs(*extra):
        """Create the output directory (and any extra ones)"""
        for directory in (Config.OUTPUT_DIR, *extra):
            if not directory:
                continue
            try:
                os.makedirs(directory, exist_ok=True)
            except OSError as e:
                logger.warning("Could not create directory %s: %s", directory, e)
