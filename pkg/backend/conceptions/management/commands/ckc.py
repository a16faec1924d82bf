"""Comando de gerenciamento `ckc`: front end de linha de comando do motor"""

import argparse

from django.core.management.base import BaseCommand, CommandError

from ...cli import run
from ...utils import EXIT_OK


class Command(BaseCommand):
    """
    python manage.py ckc <validate|solve|relate|graph|plan|diagnose|packs|concepts> [opções]

    Códigos de saída: 0 vale, 1 não vale, 2 erro de uso, 3 pacote ou traço inválido.
    """

    help = "Valida pacotes cKç e consulta resolve, relações, grafo, caminhos e diagnóstico"

    def add_arguments(self, parser):
        # As opções do subcomando seguem intactas para o parser do cli
        parser.add_argument("args", nargs=argparse.REMAINDER, help="subcomando e suas opções")

    def handle(self, *args, **options):
        result = run(list(args))
        if result.text:
            self.stdout.write(result.text, ending="")
        if result.exit_code != EXIT_OK:
            message = result.error or "property does not hold"
            raise CommandError(message, returncode=result.exit_code)
