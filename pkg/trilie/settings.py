from pathlib import Path
import os
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / '.env')


# Only the management command runs; there is no web surface.
SECRET_KEY = os.getenv('SECRET_KEY', 'trilie-local-only')

DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third party apps
    'rest_framework',

    # Local apps
    'core',
    'threelie',
    'compatible',
    'extensions',
    'cli',
]

MIDDLEWARE = []

# No models anywhere; tests run as SimpleTestCase.
DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Django REST Framework settings (serializers only, used for the file formats)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': True,
}


# Algebra settings
TRILIE_MAX_DEGREE = int(os.getenv('TRILIE_MAX_DEGREE', '4'))
TRILIE_MATRIX_WARN_ENTRIES = int(os.getenv('TRILIE_MATRIX_WARN_ENTRIES', '1000000'))
TRILIE_DEFAULT_SEED = int(os.getenv('TRILIE_DEFAULT_SEED', '20240417'))
TRILIE_VERIFY_PATHS = os.getenv('TRILIE_VERIFY_PATHS', 'true').lower() == 'true'
TRILIE_CORPUS_DIR = BASE_DIR / 'corpus'

# (k1, k2) samples for the pencil check; contains three pairwise non-proportional points
TRILIE_PENCIL_GRID = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 3)]


# Logging
TRILIE_LOG_LEVEL = os.getenv('TRILIE_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': TRILIE_LOG_LEVEL,
            'propagate': False,
        }
        for app in ('core', 'threelie', 'compatible', 'extensions', 'cli')
    },
}
