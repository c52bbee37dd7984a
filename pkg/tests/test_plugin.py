import sys
from pathlib import Path

import pytest

from tabrecast.errors import PluginProtocolError
from tabrecast.plugin import PluginClient

STUB = str(Path(__file__).with_name("stub_plugin.py"))


def client(mode="ok", **kw):
    return PluginClient([sys.executable, STUB, mode], **kw)


def test_statement_from_plugin():
    with client() as c:
        assert c.qa2d("How many seats did Party B win?", "89") == "Party B won 89 seats."


def test_unknown_question_falls_back_to_templates():
    with client() as c:
        assert c.qa2d("Which party won 89 seats?", "Party B") == "Party B won 89 seats."


def test_paraphrase_is_chosen_from_plugin_output():
    with client(seed=3) as c:
        assert c.paraphrase("Party B won 89 out of 298 seats.") == \
            "Out of a total of 298 available seats, Party B won 89."
        assert c.paraphrase("No alternatives here.") == "No alternatives here."


def test_bad_handshake():
    with pytest.raises(PluginProtocolError):
        client("no-handshake")


def test_mismatched_id_is_a_protocol_error():
    with client("bad-id") as c:
        with pytest.raises(PluginProtocolError):
            c.qa2d("q?", "a")


def test_crash_falls_back_and_is_counted():
    with client("crash") as c:
        assert c.qa2d("Who won the race?", "Kim") == "Kim won the race."
        assert c.qa2d("Who won the race?", "Kim") == "Kim won the race."
        assert c.diag["plugin_crashed"] == 1
        assert c.diag["plugin_unavailable"] == 1


def test_malformed_response_falls_back():
    with client("garbage") as c:
        assert c.paraphrase("text") == "text"
        assert c.diag["plugin_malformed_response"] == 1


def test_timeout_falls_back_and_late_reply_is_discarded():
    with client("slow-first", timeout=0.7) as c:
        assert c.qa2d("How many seats did Party B win?", "89") is None     # template cannot do "How many"
        assert c.diag["plugin_timeout"] == 1
        assert c.qa2d("How many seats did Party B win?", "89") == "Party B won 89 seats."


def test_missing_executable():
    with pytest.raises(PluginProtocolError):
        PluginClient(["/nonexistent/plugin-binary"])
