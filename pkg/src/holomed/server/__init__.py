from holomed.server.config import ServerConfig, load_config
from holomed.server.runtime import Server, run

__all__ = ["Server", "ServerConfig", "load_config", "run"]
