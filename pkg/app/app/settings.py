import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!

# This will retrieve the SECRET_KEY from the environment
# If it is not found, it will use the default value 'changeme'
SECRET_KEY = os.environ.get('SECRET_KEY', 'changeme')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = bool(int(os.environ.get('DEBUG', 0)))

ALLOWED_HOSTS = []
# Extend will append the filtered ALLOWED_HOSTS values to the list
ALLOWED_HOSTS.extend(
    # filter() will remove any empty strings from the list
    filter(
        None,
        # Will retrieve the comma separated string value
        # and convert it to a list
        os.environ.get('ALLOWED_HOSTS', '').split(','),
    )
)


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'core',
    'rest_framework',
    'drf_spectacular',
    'sysid',
    'experiment',
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
# Trials are stored in a local SQLite file unless DB_PATH points elsewhere

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('DB_PATH', str(BASE_DIR / 'db.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (CSS, JavaScript, Images)

STATIC_URL = '/static/static/'
STATIC_ROOT = os.environ.get('STATIC_ROOT', str(BASE_DIR / 'static'))

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# DRF Spectacular documentation settings for our API
REST_FRAMEWORK = {
    'DEFAULT_SCHEMA_CLASS': 'drf_spectacular.openapi.AutoSchema',
}

SPECTACULAR_SETTINGS = {
    'TITLE': 'Cyclic polytope identification API',
    'DESCRIPTION': 'Saved identification experiments and their trials',
}


# Logging
# Numerical modules log through logging.getLogger(__name__)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'sysid': {
            'handlers': ['console'],
            'level': os.environ.get('LOG_LEVEL', 'WARNING'),
        },
        'experiment': {
            'handlers': ['console'],
            'level': os.environ.get('LOG_LEVEL', 'WARNING'),
        },
    },
}


# Experiment harness settings

# Default directory where run/study write their reports
RESULTS_DIR = os.environ.get('RESULTS_DIR', str(BASE_DIR / 'results'))
# Number of worker processes used to run trials. 1 runs them in-process.
SYSID_WORKERS = int(os.environ.get('SYSID_WORKERS', 1))
# Statistical acceptance tests take minutes; they only run when enabled
SYSID_SLOW_TESTS = bool(int(os.environ.get('SYSID_SLOW_TESTS', 0)))
