import argparse
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import BudgetExceeded, HypothesisViolation, InputError, PreconditionViolation
from toolkit.formats import read_trn
from toolkit.forms import TerminalsForm
from toolkit.serializers import render

logger = logging.getLogger(__name__)

# Exit codes
OK = 0
NEGATIVE = 1
INPUT_ERROR = 2
HYPOTHESIS_ERROR = 3
INTERNAL_ERROR = 4


@dataclass
class Outcome:
    # a JSON-ready document, or raw text written as-is
    document: object
    summary: str
    code: int = OK


def clean(form):
    """Validate a Django form, turning its errors into an InputError."""
    if not form.is_valid():
        details = "; ".join(f"{field}: {' '.join(errors)}" for field, errors in form.errors.items())
        raise InputError(details)
    return form.cleaned_data


class TournamentCommand(BaseCommand):
    """
    Shared flags and the exception-to-exit-code mapping. Subclasses implement
    `run(T, **options)` and return an Outcome; T is None unless `reads_tournament`.
    """

    requires_system_checks = []
    reads_tournament = True

    def add_arguments(self, parser):
        if self.reads_tournament:
            parser.add_argument("--in", dest="input", required=True, help="TRN file to read")
        parser.add_argument("--out", help="Write the document to this file instead of standard output")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--format", choices=["json", "text"], default="json")
        parser.add_argument("--verify", action="store_true", help="Check the result with the exhaustive oracles")
        parser.add_argument(
            "--check-hypotheses",
            action=argparse.BooleanOptionalAction,
            default=None,
            help="Force the connectivity and out-degree gate on or off (default: by size)",
        )
        parser.add_argument("--budget", type=int, help="Oracle size limit")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, T, **options) -> Outcome:
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            T = read_trn(options["input"]) if self.reads_tournament else None
            outcome = self.run(T, **options)
        except (InputError, BudgetExceeded) as exc:
            raise CommandError(str(exc), returncode=INPUT_ERROR)
        except ValidationError as exc:
            raise CommandError("; ".join(exc.messages), returncode=INPUT_ERROR)
        except HypothesisViolation as exc:
            self.emit(Outcome({"hypothesis_violation": exc.report}, str(exc)), options)
            raise CommandError(str(exc), returncode=HYPOTHESIS_ERROR)
        except PreconditionViolation as exc:
            logger.exception(f"step {exc.step} failed")
            raise CommandError(f"{exc.step}: {exc} [{exc.inequality}]", returncode=INTERNAL_ERROR)

        self.emit(outcome, options)
        if outcome.code != OK:
            raise CommandError(outcome.summary, returncode=outcome.code)

    def emit(self, outcome: Outcome, options) -> None:
        if isinstance(outcome.document, str):
            content = outcome.document
        elif options["format"] == "text":
            content = outcome.summary
        else:
            content = render(outcome.document)
        if not content.endswith("\n"):
            content += "\n"

        if options.get("out"):
            Path(options["out"]).write_text(content)
        else:
            self.stdout.write(content, ending="")


def add_terminal_arguments(parser):
    parser.add_argument("--k", type=int)
    parser.add_argument("--sources", help="Comma-separated source vertices x_1,...,x_k")
    parser.add_argument("--sinks", help="Comma-separated sink vertices y_1,...,y_k")


def resolve_terminals(T, options) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """--sources/--sinks when given, otherwise k disjoint random pairs drawn from --seed."""
    if options.get("sources") is not None or options.get("sinks") is not None:
        data = clean(TerminalsForm({"sources": options.get("sources"), "sinks": options.get("sinks"), "k": options.get("k")}))
        return data["sources"], data["sinks"]
    k = options.get("k")
    if not k or k < 1 or 2 * k > T.n:
        raise InputError(f"give --sources and --sinks, or a --k with 1 <= 2k <= n={T.n}")
    chosen = [int(v) for v in np.random.default_rng(options["seed"]).choice(T.n, 2 * k, replace=False)]
    logger.info(f"random terminals from seed {options['seed']}: {chosen[:k]} -> {chosen[k:]}")
    return tuple(chosen[:k]), tuple(chosen[k:])
