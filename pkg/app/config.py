# app/config.py
import os
from dotenv import load_dotenv

load_dotenv()


def _env_bool(name, default):
    return os.getenv(name, str(default)).strip().lower() in ("1", "true", "yes", "on")


class Config:
    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_DIR = os.getenv('LOG_DIR', 'logs')
    LOG_FILE = os.getenv('LOG_FILE', 'tila.log')
    LOG_MAX_BYTES = int(os.getenv('LOG_MAX_BYTES', 10 * 1024 * 1024))  # 10MB
    LOG_BACKUP_COUNT = int(os.getenv('LOG_BACKUP_COUNT', 5))
    LOG_TO_FILE = _env_bool('LOG_TO_FILE', True)

    # Classification scan
    CLASSIFY_GRID_HEIGHT = int(os.getenv('CLASSIFY_GRID_HEIGHT', 4))
    CLASSIFY_GRID_RANGE = int(os.getenv('CLASSIFY_GRID_RANGE', 2))
    CLASSIFY_WORKERS = int(os.getenv('CLASSIFY_WORKERS', 1))
    SHOW_PROGRESS = _env_bool('SHOW_PROGRESS', False)

    # Memoized catalog builds
    TILA_CACHE_SIZE = int(os.getenv('TILA_CACHE_SIZE', 64))

    # Report schemas
    SCHEMA_DIR = os.getenv('SCHEMA_DIR', os.path.join(os.path.dirname(os.path.abspath(__file__)), 'schemas'))
    VALIDATE_REPORTS = _env_bool('VALIDATE_REPORTS', True)

    # Environment Settings
    ENVIRONMENT = os.getenv('ENVIRONMENT', 'development')

    @staticmethod
    def create_directories():
        """Create necessary directories if they don't exist"""
        directories = [Config.LOG_DIR]
        for directory in directories:
            try:
                os.makedirs(directory, exist_ok=True)
            except Exception as e:
                print(f"Warning: Could not create directory {directory}: {e}")

    @staticmethod
    def validate_config():
        """Validate configuration settings"""
        errors = []
        warnings = []

        if Config.CLASSIFY_GRID_HEIGHT < 1:
            errors.append("CLASSIFY_GRID_HEIGHT must be at least 1")
        if Config.CLASSIFY_GRID_RANGE <= 0:
            errors.append("CLASSIFY_GRID_RANGE must be positive")
        if Config.CLASSIFY_WORKERS < 1:
            errors.append("CLASSIFY_WORKERS must be at least 1")
        if Config.TILA_CACHE_SIZE < 1:
            errors.append("TILA_CACHE_SIZE must be at least 1")

        if Config.CLASSIFY_GRID_HEIGHT > 8:
            warnings.append("Grid height above 8 makes the classification scan very slow")
        if not os.path.isdir(Config.SCHEMA_DIR):
            errors.append(f"Schema directory not found: {Config.SCHEMA_DIR}")
        if not Config.VALIDATE_REPORTS:
            warnings.append("Report schema validation is disabled")

        return errors, warnings

    @staticmethod
    def get_service_info():
        """Get information about the effective settings"""
        return {
            "logging": {
                "level": Config.LOG_LEVEL,
                "file": os.path.join(Config.LOG_DIR, Config.LOG_FILE) if Config.LOG_TO_FILE else None,
            },
            "classify": {
                "grid_height": Config.CLASSIFY_GRID_HEIGHT,
                "grid_range": Config.CLASSIFY_GRID_RANGE,
                "workers": Config.CLASSIFY_WORKERS,
                "progress": Config.SHOW_PROGRESS,
            },
            "cache": {"tila_builds": Config.TILA_CACHE_SIZE},
            "reports": {
                "schema_dir": Config.SCHEMA_DIR,
                "validate": Config.VALIDATE_REPORTS,
            },
            "environment": Config.ENVIRONMENT,
        }

    @staticmethod
    def print_config_summary():
        """Print a summary of the current configuration"""
        print("=" * 50)
        print("WORKBENCH CONFIGURATION SUMMARY")
        print("=" * 50)
        print(f"Environment: {Config.ENVIRONMENT}")
        print(f"Log Level: {Config.LOG_LEVEL}")
        print(f"Log File: {Config.LOG_DIR}/{Config.LOG_FILE} (enabled: {Config.LOG_TO_FILE})")
        print(f"Grid: height {Config.CLASSIFY_GRID_HEIGHT}, range {Config.CLASSIFY_GRID_RANGE}")
        print(f"Scan Workers: {Config.CLASSIFY_WORKERS}")
        print(f"Tila Cache Size: {Config.TILA_CACHE_SIZE}")
        print(f"Schema Dir: {Config.SCHEMA_DIR}")
        print("=" * 50)

        errors, warnings = Config.validate_config()

        if errors:
            print("CONFIGURATION ERRORS:")
            for error in errors:
                print(f"  [ERROR] {error}")

        if warnings:
            print("CONFIGURATION WARNINGS:")
            for warning in warnings:
                print(f"  [WARNING] {warning}")

        if not errors and not warnings:
            print("[SUCCESS] Configuration validation passed")

        print("=" * 50)
