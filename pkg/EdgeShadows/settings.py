from pathlib import Path
from decouple import config, Csv
import dj_database_url

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-edge-shadows-local-development-key')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=Csv())

# Application definition
INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',

    # Local apps
    'core',
    'algebra',
    'shadows',
    'goldens',
    'series',
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

ROOT_URLCONF = 'EdgeShadows.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'EdgeShadows.wsgi.application'

# Database Configuration
# SQLite locally, PostgreSQL in deployment via DATABASE_URL
DATABASES = {
    'default': dj_database_url.config(
        default=f'sqlite:///{BASE_DIR / "db.sqlite3"}',
        conn_max_age=600
    )
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

STATIC_URL = 'static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Shadow generator settings
# Golden corpus directory; the env var overrides the embedded tables
SHADOW_GOLDEN_DIR = config('SHADOW_GOLDEN_DIR', default=str(BASE_DIR / 'goldens' / 'corpus'))

# Numeric evaluation (mpmath working precision and finite-difference steps)
SHADOW_EVAL_DPS = config('SHADOW_EVAL_DPS', default=60, cast=int)
SHADOW_FD_RELATIVE_STEP = config('SHADOW_FD_RELATIVE_STEP', default='1e-12')
SHADOW_FD_ANGULAR_STEP = config('SHADOW_FD_ANGULAR_STEP', default='1e-12')
SHADOW_RESIDUAL_TOLERANCE = config('SHADOW_RESIDUAL_TOLERANCE', default='0.3')

SHADOW_LOG_LEVEL = config('SHADOW_LOG_LEVEL', default='INFO')

# Logging: everything to stderr so command stdout stays a clean document
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
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'algebra': {'handlers': ['console'], 'level': SHADOW_LOG_LEVEL, 'propagate': False},
        'shadows': {'handlers': ['console'], 'level': SHADOW_LOG_LEVEL, 'propagate': False},
        'goldens': {'handlers': ['console'], 'level': SHADOW_LOG_LEVEL, 'propagate': False},
        'series': {'handlers': ['console'], 'level': SHADOW_LOG_LEVEL, 'propagate': False},
    },
}

# Production Security Settings (HTTPS)
if not DEBUG:
    SECURE_PROXY_SSL_HEADER = ('HTTP_X_FORWARDED_PROTO', 'https')
    SECURE_SSL_REDIRECT = True
    SESSION_COOKIE_SECURE = True
    CSRF_COOKIE_SECURE = True
    SECURE_CONTENT_TYPE_NOSNIFF = True
    X_FRAME_OPTIONS = 'DENY'
