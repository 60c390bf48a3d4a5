import json
import shutil
from pathlib import Path

import pytest

from tam_extract.cli import EXIT_IO, EXIT_OK, EXIT_PACK, EXIT_USAGE, main
from tam_extract.lexicon import CompiledLexicon
from tam_extract.pack import shipped_pack_root

CORPUS = Path(__file__).parent / "data" / "corpus"
SHIPPED = Path(str(shipped_pack_root()))


def test_help(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "compile-lexicon" in capsys.readouterr().out


def test_missing_command():
    assert main([]) == EXIT_USAGE


def test_catalog(capsys):
    assert main(["catalog"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "incidence_sentence\tlevel3\tsentence_analysis" in lines


def test_validate_shipped_pack(capsys):
    assert main(["validate-pack", str(SHIPPED)]) == EXIT_OK
    assert "Pack 'tr' is valid" in capsys.readouterr().out


def test_validate_broken_pack(tmp_path, capsys):
    pack = tmp_path / "tr"
    shutil.copytree(SHIPPED, pack)
    grammar = pack / "level1.grm"
    grammar.write_text(grammar.read_text(encoding="utf-8").replace('"disaster"', '"calamity"'), encoding="utf-8")
    assert main(["validate-pack", str(pack)]) == EXIT_PACK
    assert "error: rule 'disaster_detector': GTYPE 'calamity'" in capsys.readouterr().out


def test_compile_lexicon(tmp_path, capsys):
    target = tmp_path / "lexicon.json"
    args = ["compile-lexicon", str(SHIPPED / "lexicon.lex"), str(target), "--types", str(SHIPPED / "types.decl")]
    assert main(args) == EXIT_OK
    lexicon = CompiledLexicon.load(target)
    assert f"Compiled {len(lexicon)} entries" in capsys.readouterr().out
    assert lexicon.lookup("ihtiyaç var")


class TestRun:
    def test_blocks_to_stdout(self, capsys):
        assert main(["run", "--input", str(CORPUS / "14-1-VanDeprem-ND.txt")]) == EXIT_OK
        out = capsys.readouterr().out
        assert '# Kızılay: "İçme suyu ve iş makinalarına ihtiyaç var"\nsentence_analysis\n' in out
        assert "HUMANITARIAN_NEED : --içme suyu-iş makinası" in out

    def test_json_with_filter(self, tmp_path):
        target = tmp_path / "out.json"
        args = ["run", "--input", str(CORPUS), "--format", "json", "--filter", "volitional=hearsay", "--out", str(target)]
        assert main(args) == EXIT_OK
        payload = json.loads(target.read_text(encoding="utf-8"))
        assert payload
        assert {item["tam"]["volitional"]["base"] for item in payload} == {"hearsay"}

    def test_output_is_deterministic(self, tmp_path):
        outputs = []
        for name in ("first.txt", "second.txt"):
            target = tmp_path / name
            assert main(["run", "--input", str(CORPUS), "--workers", "2", "--out", str(target)]) == EXIT_OK
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1]
        assert outputs[0]

    @pytest.mark.parametrize(
        "extra",
        [["--filter", "mood=happy"], ["--workers", "0"], ["--mode", "fastest"], ["--format", "xml"]],
    )
    def test_usage_errors(self, extra):
        assert main(["run", "--input", str(CORPUS), *extra]) == EXIT_USAGE

    def test_bad_file_name(self, tmp_path):
        path = tmp_path / "haber.txt"
        path.write_text("Deprem oldu.", encoding="utf-8")
        assert main(["run", "--input", str(path)]) == EXIT_USAGE

    def test_missing_input(self, tmp_path):
        assert main(["run", "--input", str(tmp_path / "nowhere")]) == EXIT_IO

    def test_missing_pack(self, tmp_path):
        assert main(["run", "--pack", str(tmp_path / "nowhere"), "--input", str(CORPUS)]) == EXIT_PACK

    def test_pack_from_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("TAM_PACK", str(tmp_path / "nowhere"))
        assert main(["run", "--input", str(CORPUS)]) == EXIT_PACK
