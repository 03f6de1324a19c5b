# Services package for configuration and the result cache
