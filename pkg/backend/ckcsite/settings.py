"""
Django settings for ckcsite project.

Projeto sem banco de dados e sem rotas HTTP: o Django fornece configuração,
os comandos de gerenciamento (CLI `ckc`) e a integração com o pytest.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

# cSpell: words dotenv ckcsite

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "django-insecure-ckc-local-only")

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv("DJANGO_DEBUG", "false").lower() == "true"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "conceptions.apps.ConceptionsConfig",
]

REST_FRAMEWORK = {
    # Nenhuma view é exposta; os serializers são usados só para validar e representar
    "UNAUTHENTICATED_USER": None,
}

# Sem armazenamento persistente
DATABASES = {}

USE_I18N = False

USE_TZ = True

TIME_ZONE = "America/Sao_Paulo"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


def _env_bool(name, default):
    return os.getenv(name, str(default)).strip().lower() in ("1", "true", "yes", "on")


# Parâmetros do motor cKç
CKC = {
    "BUDGET_DEPTH": int(os.getenv("CKC_BUDGET_DEPTH", "12")),
    "BUDGET_STATES": int(os.getenv("CKC_BUDGET_STATES", "100000")),
    "STRICT_LAST_ACTOR": _env_bool("CKC_STRICT_LAST_ACTOR", False),
    "FALSITY_DEPTH": int(os.getenv("CKC_FALSITY_DEPTH", "1")),
    "GRAPH_WORKERS": int(os.getenv("CKC_GRAPH_WORKERS", "4")),
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "conceptions": {
            "handlers": ["console"],
            "level": os.getenv("CKC_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}
