from toolkit.forms import GenSpecForm
from toolkit.formats import save
from toolkit.management.base import Outcome, TournamentCommand, clean
from toolkit.structures import INNER_CHOICES, MODEL_CHOICES, RANDOM
from toolkit.utils import generate


class Command(TournamentCommand):
    help = "Generate a tournament and write it in TRN format."
    reads_tournament = False

    def add_command_arguments(self, parser):
        parser.add_argument("--model", choices=[value for value, _ in MODEL_CHOICES], default=RANDOM)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--split", type=int, help="Size of the dominating block (blocks model)")
        parser.add_argument("--inner", choices=[value for value, _ in INNER_CHOICES], default=RANDOM)

    def run(self, T, **options):
        form = GenSpecForm(
            {
                "model": options["model"],
                "n": options["n"],
                "seed": options["seed"],
                "split": options.get("split"),
                "inner": options["inner"],
            }
        )
        clean(form)
        T = generate(form.to_spec())
        return Outcome(save(T), f"{T.provenance}, n={T.n}")
