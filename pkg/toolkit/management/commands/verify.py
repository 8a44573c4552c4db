import io
from pathlib import Path

from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from core.exceptions import InputError
from oracle.utils import validate_path_system
from toolkit.management.base import NEGATIVE, OK, Outcome, TournamentCommand, add_terminal_arguments, resolve_terminals
from toolkit.serializers import PathSystemSerializer, ViolationSerializer


class Command(TournamentCommand):
    help = "Re-read a path-system document and validate it against a tournament."

    def add_command_arguments(self, parser):
        parser.add_argument("--paths", required=True, help="JSON path system, or the document written by link")
        add_terminal_arguments(parser)

    def run(self, T, **options):
        try:
            data = JSONParser().parse(io.BytesIO(Path(options["paths"]).read_bytes()))
        except OSError as exc:
            raise InputError(f"cannot read {options['paths']}: {exc.strerror}")
        except ParseError as exc:
            raise InputError(f"{options['paths']}: {exc.detail}")
        if isinstance(data, dict) and isinstance(data.get("paths"), dict):
            data = data["paths"]

        serializer = PathSystemSerializer(data=data)
        if not serializer.is_valid():
            raise InputError(f"malformed path system: {serializer.errors}")
        system = serializer.save()

        if options.get("sources") is not None or options.get("sinks") is not None:
            expected = list(zip(*resolve_terminals(T, options)))
        else:
            expected = list(system.pairs)
        violations = validate_path_system(T, expected, system)

        document = {"valid": not violations, "violations": ViolationSerializer(violations, many=True).data}
        summary = "valid" if not violations else "\n".join(str(v) for v in violations)
        return Outcome(document, summary, NEGATIVE if violations else OK)
