"""Arquivo de configuração do aplicativo"""

import logging

from django.apps import AppConfig

logger = logging.getLogger(__name__)


class ConceptionsConfig(AppConfig):
    """Classe de configuração do aplicativo"""

    default_auto_field = "django.db.models.BigAutoField"
    name = "conceptions"
    verbose_name = "Motor de Concepções cKç"

    def ready(self):
        """
        Função chamada quando o aplicativo está pronto.
        """
        # pylint: disable=import-outside-toplevel
        from .utils import CKC_DEFAULTS, ckc_setting

        settings = {name: ckc_setting(name) for name in CKC_DEFAULTS}
        logger.debug("Parâmetros do motor: %s", settings)
