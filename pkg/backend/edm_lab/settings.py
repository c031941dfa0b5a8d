# flake8: noqa
import os
from pathlib import Path

from django.core.management.utils import get_random_secret_key
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(dotenv_path=os.path.join(BASE_DIR.parent, ".env"))

SECRET_KEY = os.getenv('SECRET_KEY', get_random_secret_key())

DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'distributions',
    'edm',
    'linalg',
    'coherence',
    'theory',
    'completion',
    'experiments',
    'cli',
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.getenv('EDM_DB_PATH', BASE_DIR / 'db.sqlite3'),
    }
}

LANGUAGE_CODE = 'ru-RU'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.getenv('EDM_LOG_LEVEL', 'WARNING').upper(),
    },
}

EDM_LAB = {
    'THREADS': int(os.getenv('EDM_THREADS', os.cpu_count() or 1)),
    'OUTPUT_DIR': os.getenv('EDM_OUTPUT_DIR', 'run'),
    'FLOAT_DIGITS': 12,
    'RANK_REL_TOL': 1e-10,
    'SUCCESS_THRESHOLD': 1e-3,
    'SVT': {
        'TAU_FACTOR': 5.0,
        'STEP_FACTOR': 1.2,
        'TOL': 1e-4,
        'MAX_ITER': 1000,
    },
}
