# Configuration module for channel presets and numerical defaults
