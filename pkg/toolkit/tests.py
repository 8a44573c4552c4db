import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO
from pathlib import Path

from django.test import SimpleTestCase

from core.exceptions import InputError
from core.structures import Tournament
from core.utils import vertex_set

from .cli import cli_main
from .formats import load, read_trn, save, write_trn
from .forms import GenSpecForm, TerminalsForm
from .serializers import PathSystemSerializer
from .structures import BLOCKS, RANDOM, ROTATIONAL_QR, TRANSITIVE, GenSpec
from .utils import generate, pair_bit, random_tournament, rotational_qr, transitive


class GeneratorTests(SimpleTestCase):
    def test_transitive(self):
        T = transitive(5)
        for i in range(5):
            self.assertEqual(T.out_masks[i], vertex_set(range(i + 1, 5)))

    def test_rotational_qr7(self):
        T = rotational_qr(7)
        self.assertEqual(T.out_masks[0], vertex_set([1, 2, 4]))
        self.assertEqual(list(T.out_degrees()), [3] * 7)

    def test_invalid_modulus(self):
        for n in (13, 15):
            with self.assertRaises(InputError):
                generate(GenSpec(ROTATIONAL_QR, n))

    def test_random_is_reproducible(self):
        first = save(random_tournament(20, seed=42))
        self.assertEqual(first, save(random_tournament(20, seed=42)))
        self.assertTrue(first.startswith("TRN v1 gen=seedseq-pair-v1 model=random seed=42\n"))
        self.assertNotEqual(first, save(random_tournament(20, seed=43)))
        self.assertEqual(pair_bit(42, 3, 5), pair_bit(42, 5, 3))

    def test_blocks_dominate(self):
        T = generate(GenSpec(BLOCKS, 9, seed=1, split=4))
        for a in range(4):
            self.assertEqual(T.out_masks[a] & vertex_set(range(4, 9)), vertex_set(range(4, 9)))
        self.assertIn("split=4 inner=random", T.provenance)

    def test_bad_split(self):
        with self.assertRaises(InputError):
            generate(GenSpec(BLOCKS, 5, split=5))


class FormatTests(SimpleTestCase):
    def test_transitive_three(self):
        self.assertEqual(save(transitive(3)), "TRN v1 gen=seedseq-pair-v1 model=transitive\n3\n-11\n0-1\n00-\n")

    def test_round_trip(self):
        families = [
            transitive(6),
            rotational_qr(7),
            random_tournament(15, seed=3),
            generate(GenSpec(BLOCKS, 10, seed=2, inner=TRANSITIVE)),
        ]
        for T in families:
            text = save(T)
            self.assertEqual(save(load(text)), text)
            self.assertEqual(load(text), T)

    def test_header_without_provenance(self):
        T = load("TRN v1\n2\n-1\n0-\n")
        self.assertEqual(T.provenance, "")
        self.assertEqual(save(T), "TRN v1\n2\n-1\n0-\n")

    def test_complementarity_error(self):
        with self.assertRaisesRegex(InputError, r"line 4, column 1: complementarity violated at \(1,0\)"):
            load("TRN v1\n2\n-1\n1-\n")

    def test_malformed(self):
        cases = [
            ("TRX v1\n1\n-\n", "line 1"),
            ("TRN v1\nthree\n", "line 2"),
            ("TRN v1\n3\n-11\n0-\n00-\n", "line 4"),
            ("TRN v1\n2\n01\n0-\n", "diagonal"),
            ("TRN v1\n2\n-x\n0-\n", "unexpected character"),
            ("TRN v1\n3\n-11\n0-1\n", "expected 3 matrix rows"),
        ]
        for text, message in cases:
            with self.assertRaisesRegex(InputError, message):
                load(text)

    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "t.trn"
            write_trn(rotational_qr(7), path)
            self.assertEqual(read_trn(path), rotational_qr(7))
            with self.assertRaises(InputError):
                read_trn(Path(tmp) / "missing.trn")


class FormTests(SimpleTestCase):
    def test_gen_spec(self):
        form = GenSpecForm({"model": BLOCKS, "n": 10, "seed": 7, "split": 3, "inner": TRANSITIVE})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.to_spec(), GenSpec(BLOCKS, 10, 7, 3, TRANSITIVE))

        form = GenSpecForm({"model": RANDOM, "n": 10})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.to_spec(), GenSpec(RANDOM, 10))

    def test_gen_spec_errors(self):
        self.assertIn("n", GenSpecForm({"model": ROTATIONAL_QR, "n": 13}).errors)
        self.assertIn("split", GenSpecForm({"model": RANDOM, "n": 10, "split": 3}).errors)
        self.assertIn("split", GenSpecForm({"model": BLOCKS, "n": 10, "split": 10}).errors)
        self.assertIn("model", GenSpecForm({"model": "paley", "n": 10}).errors)

    def test_terminals(self):
        form = TerminalsForm({"sources": "0, 1", "sinks": "5,6", "k": 2})
        self.assertTrue(form.is_valid())
        self.assertEqual((form.cleaned_data["sources"], form.cleaned_data["sinks"]), ((0, 1), (5, 6)))

        self.assertFalse(TerminalsForm({"sources": "0,1", "sinks": "5"}).is_valid())
        self.assertFalse(TerminalsForm({"sources": "0,1", "sinks": "1,2"}).is_valid())
        self.assertFalse(TerminalsForm({"sources": "a,b", "sinks": "1,2"}).is_valid())
        self.assertFalse(TerminalsForm({"sources": "0,1", "sinks": "5,6", "k": 3}).is_valid())


class SerializerTests(SimpleTestCase):
    def test_rejects_inconsistent_documents(self):
        self.assertFalse(PathSystemSerializer(data={"pairs": [[0, 2]], "paths": []}).is_valid())
        self.assertFalse(PathSystemSerializer(data={"pairs": [[0, 2]], "paths": [[0, 1, 0, 2]]}).is_valid())

    def test_reads_permutation_keys_as_ints(self):
        serializer = PathSystemSerializer(data={"pairs": [[0, 2]], "paths": [[0, 1, 2]], "permutation": {"0": 0}})
        self.assertTrue(serializer.is_valid())
        self.assertEqual(serializer.save().permutation, {0: 0})


class CommandTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def run_cli(self, *argv):
        out, err = StringIO(), StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = cli_main([str(a) for a in argv])
        return code, out.getvalue(), err.getvalue()

    def trn(self, T, name="t.trn"):
        path = self.dir / name
        write_trn(T, path)
        return path

    def test_gen(self):
        path = self.dir / "g.trn"
        code, _, _ = self.run_cli("gen", "--model", "rotational-qr", "--n", 7, "--out", path)
        self.assertEqual(code, 0)
        self.assertEqual(read_trn(path), rotational_qr(7))

        first = self.run_cli("gen", "--n", 20, "--seed", 42)
        second = self.run_cli("gen", "--n", 20, "--seed", 42)
        self.assertEqual(first[1], second[1])
        self.assertEqual(first[1], save(random_tournament(20, seed=42)))

    def test_gen_rejects_bad_modulus(self):
        code, _, err = self.run_cli("gen", "--model", "rotational-qr", "--n", 13)
        self.assertEqual(code, 2)
        self.assertIn("prime", err)

    def test_link_and_verify(self):
        path = self.trn(random_tournament(120, seed=0))
        out = self.dir / "paths.json"
        code, _, _ = self.run_cli("link", "--in", path, "--k", 2, "--sources", "0,1", "--sinks", "5,6", "--verify", "--out", out)
        self.assertEqual(code, 0)
        document = json.loads(out.read_text())
        self.assertEqual(document["violations"], [])
        self.assertEqual([p[0] for p in document["paths"]["paths"]], [0, 1])
        self.assertEqual([p[-1] for p in document["paths"]["paths"]], [5, 6])
        self.assertEqual(len(document["trace"]["peels"]), 11)

        code, stdout, _ = self.run_cli("verify", "--in", path, "--paths", out)
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(stdout)["valid"])

        code, _, _ = self.run_cli("verify", "--in", path, "--paths", out, "--sources", "1,0", "--sinks", "5,6")
        self.assertEqual(code, 1)

    def test_link_hypothesis_gate(self):
        path = self.trn(transitive(30))
        code, stdout, err = self.run_cli("link", "--in", path, "--sources", "0,1", "--sinks", "5,6", "--check-hypotheses")
        self.assertEqual(code, 3)
        self.assertIn("kappa", err)
        self.assertIn("connectivity", json.loads(stdout)["hypothesis_violation"]["failed"])

    def test_link_below_thresholds_without_gate(self):
        path = self.trn(Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)]))
        self.assertEqual(self.run_cli("link", "--in", path, "--sources", "0", "--sinks", "2")[0], 3)

        code, stdout, _ = self.run_cli("link", "--in", path, "--sources", "0", "--sinks", "2", "--no-check-hypotheses", "--verify")
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(document["paths"]["paths"], [[0, 1, 2]])
        self.assertIsNone(document["trace"]["hypotheses"])
        self.assertEqual(document["violations"], [])

    def test_conn(self):
        code, stdout, _ = self.run_cli("conn", "--in", self.trn(transitive(10)), "--at-least", 19)
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(stdout)["k_connected"])

        code, stdout, _ = self.run_cli("conn", "--in", self.trn(rotational_qr(7)), "--verify")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(stdout)["count"], 3)

        code, stdout, _ = self.run_cli("conn", "--in", self.trn(rotational_qr(7)), "--pair", "0,3", "--format", "text")
        self.assertEqual(code, 0)
        self.assertTrue(stdout.startswith("connectivity 3"))

    def test_oracle(self):
        path = self.trn(rotational_qr(7))
        code, stdout, _ = self.run_cli("oracle", "linked", "--in", path, "--sources", "0,2", "--sinks", "3,1")
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(stdout)["linked"])

        code, stdout, _ = self.run_cli("oracle", "connectivity", "--in", path)
        self.assertEqual((code, json.loads(stdout)["connectivity"]), (0, 3))

        code, _, err = self.run_cli("oracle", "connectivity", "--in", path, "--budget", 5)
        self.assertEqual(code, 2)
        self.assertIn("budget", err)

    def test_median_and_anchor(self):
        path = self.trn(random_tournament(11, seed=1))
        code, stdout, _ = self.run_cli("median", "--in", path, "--verify")
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(document["interval_violations"], [])
        self.assertGreaterEqual(document["exact_forward_arcs"], document["ordering"]["forward_arcs"])

        code, stdout, _ = self.run_cli("anchor", "--in", path, "--k", 2, "--verify")
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(len(document["systems"]), 2)
        self.assertEqual(document["violations"], [])

    def test_input_errors(self):
        bad = self.dir / "bad.trn"
        bad.write_text("TRN v1\n2\n-1\n1-\n")
        code, _, err = self.run_cli("conn", "--in", bad)
        self.assertEqual(code, 2)
        self.assertIn("(1,0)", err)
        self.assertEqual(self.run_cli("nonsense")[0], 2)
        self.assertEqual(self.run_cli("link", "--in", self.trn(transitive(5)), "--sources", "0,1", "--sinks", "1,2")[0], 2)
