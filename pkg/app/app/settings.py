import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-dsnbench-local-development-key',
)

DEBUG = bool(int(os.environ.get('DEBUG', 1)))

ALLOWED_HOSTS = os.environ.get(
    'DJANGO_ALLOWED_HOSTS', 'localhost,127.0.0.1'
).split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'drf_spectacular',
    'core',
    'channel',
    'traces',
    'harness',
    'analytics',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'app.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'app.wsgi.application'


# Database
# PostgreSQL under docker-compose, a local SQLite file otherwise.

if os.environ.get('DB_HOST'):
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.postgresql',
            'HOST': os.environ.get('DB_HOST'),
            'NAME': os.environ.get('DB_NAME'),
            'USER': os.environ.get('DB_USER'),
            'PASSWORD': os.environ.get('DB_PASS'),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'db.sqlite3',
        }
    }


AUTH_PASSWORD_VALIDATORS = [
    {
        'NAME': 'django.contrib.auth.password_validation.MinimumLengthValidator',
    },
]


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'DEFAULT_SCHEMA_CLASS': 'drf_spectacular.openapi.AutoSchema',
}

SPECTACULAR_SETTINGS = {
    'TITLE': 'dsnbench feeds',
    'DESCRIPTION': 'Atom feeds and FBSR comment feeds served by DSN bots.',
}


# Logging

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
        'level': os.environ.get('DSNBENCH_LOG_LEVEL', 'INFO'),
    },
    'loggers': {
        'django.server': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}


# DSN toolkit

DSNBENCH_HOST = os.environ.get('DSNBENCH_HOST', '127.0.0.1')
DSNBENCH_PORT_BASE = int(os.environ.get('DSNBENCH_PORT_BASE', 8100))
DSNBENCH_WORKERS = int(os.environ.get('DSNBENCH_WORKERS', 32))
DSNBENCH_FETCH_WORKERS = int(os.environ.get('DSNBENCH_FETCH_WORKERS', 8))
DSNBENCH_FETCH_TIMEOUT = float(os.environ.get('DSNBENCH_FETCH_TIMEOUT', 5))
DSNBENCH_FEED_ENTRY_LIMIT = int(
    os.environ.get('DSNBENCH_FEED_ENTRY_LIMIT', 100)
)
DSNBENCH_FEED_ROOT = Path(
    os.environ.get('DSNBENCH_FEED_ROOT', BASE_DIR / 'feeds')
)
DSNBENCH_BINS_PER_DECADE = int(
    os.environ.get('DSNBENCH_BINS_PER_DECADE', 30)
)
DSNBENCH_COMPARE_TOLERANCE = float(
    os.environ.get('DSNBENCH_COMPARE_TOLERANCE', 0.15)
)
DSNBENCH_CROSS_CHECK_TOLERANCE = float(
    os.environ.get('DSNBENCH_CROSS_CHECK_TOLERANCE', 0.01)
)
DSNBENCH_DEFAULT_DURATION = float(
    os.environ.get('DSNBENCH_DEFAULT_DURATION', 86400)
)
