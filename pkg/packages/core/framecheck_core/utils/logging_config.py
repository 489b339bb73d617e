import logging


def configure_logging(level: int = logging.INFO) -> None:
    """
    Sets up the root logger for the engine and the command line.

    :param level: Logging level, logging.INFO by default.
    """
    log_format = "%(asctime)s - %(levelname)s - %(message)s"
    logging.basicConfig(format=log_format, level=level)


def set_debug_level() -> None:
    """
    Switches the root logger to DEBUG.
    """
    logging.getLogger().setLevel(logging.DEBUG)
