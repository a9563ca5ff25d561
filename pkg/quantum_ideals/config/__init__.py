from .settings import ConfigError, EngineConfig, RunConfig, parse_int_list, parse_range

__all__ = ['ConfigError', 'EngineConfig', 'RunConfig', 'parse_int_list', 'parse_range']
