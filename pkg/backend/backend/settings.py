"""
Django settings for the aperiodic backend project.

Aperiodic - generators, spectral estimators, overlap statistics and Gibbs
samplers for aperiodically ordered lattice systems, driven from manage.py.
"""

import os
from pathlib import Path
from dotenv import load_dotenv
import dj_database_url

# Load environment variables
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-aperiodic-batch-toolkit-local-key')

DEBUG = os.getenv('DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = []

# Aperiodic-specific settings
APERIODIC_VERSION = '1.0.0'
APERIODIC_OUTPUT_DIR = Path(os.getenv('APERIODIC_OUTPUT_DIR', BASE_DIR / 'runs'))

# An empty value disables the default seed; seeded subcommands then refuse to run
_master_seed = os.getenv('APERIODIC_MASTER_SEED', '20240601').strip()
APERIODIC_MASTER_SEED = int(_master_seed) if _master_seed else None

APERIODIC_FFT_WORKERS = int(os.getenv('APERIODIC_FFT_WORKERS', '1'))
APERIODIC_DIRECT_LAG_LIMIT = int(os.getenv('APERIODIC_DIRECT_LAG_LIMIT', '1000'))
APERIODIC_ENUMERATION_LIMIT = int(os.getenv('APERIODIC_ENUMERATION_LIMIT', str(2 ** 20)))
APERIODIC_ULTRAMETRIC_EPSILON = float(os.getenv('APERIODIC_ULTRAMETRIC_EPSILON', '0.02'))
APERIODIC_OVERLAP_WORKERS = int(os.getenv('APERIODIC_OVERLAP_WORKERS', '1'))


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Aperiodic apps
    'sequences',
    'correlation',
    'spectra',
    'overlap',
    'gibbs',
    'experiments',
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': dj_database_url.config(
        default=os.getenv('DATABASE_URL', f"sqlite:///{BASE_DIR / 'db.sqlite3'}"),
        conn_max_age=600,
    )
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework configuration (serializers are used as schemas only)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'UNAUTHENTICATED_USER': None,
}

# Logging configuration
LOG_DIR = BASE_DIR / 'logs'
LOG_DIR.mkdir(exist_ok=True)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': LOG_DIR / 'aperiodic.log',
            'formatter': 'verbose',
        },
        'console': {
            'level': os.getenv('APERIODIC_CONSOLE_LOG_LEVEL', 'WARNING'),
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'aperiodic': {
            'handlers': ['file', 'console'],
            'level': 'INFO',
            'propagate': True,
        },
    },
}
