"""Debounce, compression, and snapshot save/load."""

import json

import pytest
from hypothesis import given, strategies as st

from quarry import durability
from quarry.durability import Debouncer, compress, decompress, load_all, save_index
from quarry.errors import CorruptBlobError
from quarry.store import Index

from test_store import make_index, make_meta


class FakeClock:
    """Deterministic stand-in for threading.Timer, driven by advance()."""

    def __init__(self):
        self.now = 0.0
        self.timers = []

    def timer(self, interval, fn):
        return FakeTimer(self, self.now + interval, fn)

    def advance(self, seconds):
        target = self.now + seconds
        while True:
            pending = [t for t in self.timers if not t.cancelled and t.due <= target]
            if not pending:
                break
            timer = min(pending, key=lambda t: t.due)
            self.timers.remove(timer)
            self.now = max(self.now, timer.due)
            timer.fn()
        self.now = target


class FakeTimer:
    def __init__(self, clock, due, fn):
        self.clock = clock
        self.due = due
        self.fn = fn
        self.cancelled = False
        self.daemon = False

    def start(self):
        self.clock.timers.append(self)

    def cancel(self):
        self.cancelled = True


def make_debounced(interval_ms=100):
    clock = FakeClock()
    calls = []
    debouncer = Debouncer(lambda: calls.append(clock.now), interval_ms, clock.timer)
    return clock, calls, debouncer


# -- debounce -----------------------------------------------------------------


def test_rapid_triggers_collapse_to_one_trailing_execution():
    clock, calls, debouncer = make_debounced(interval_ms=100)
    for _ in range(5):
        debouncer.trigger()
        clock.advance(0.010)
    clock.advance(10.0)
    assert calls == [pytest.approx(0.140)]  # last trigger at 40ms + 100ms


def test_single_trigger_executes_after_interval():
    clock, calls, debouncer = make_debounced(interval_ms=100)
    debouncer.trigger()
    clock.advance(0.099)
    assert calls == []
    clock.advance(0.002)
    assert len(calls) == 1


def test_no_trigger_no_execution():
    clock, calls, _ = make_debounced()
    clock.advance(10.0)
    assert calls == []


def test_trigger_after_execution_schedules_again():
    clock, calls, debouncer = make_debounced(interval_ms=100)
    debouncer.trigger()
    clock.advance(1.0)
    debouncer.trigger()
    clock.advance(1.0)
    assert len(calls) == 2


def test_cancel_drops_pending_execution():
    clock, calls, debouncer = make_debounced()
    debouncer.trigger()
    debouncer.cancel()
    clock.advance(10.0)
    assert calls == []


def test_fire_now_runs_pending_action_immediately():
    clock, calls, debouncer = make_debounced()
    debouncer.trigger()
    debouncer.fire_now()
    assert len(calls) == 1
    clock.advance(10.0)
    assert len(calls) == 1


def test_real_timer_debounce_executes():
    import threading

    done = threading.Event()
    debouncer = Debouncer(done.set, interval_ms=10)
    debouncer.trigger()
    assert done.wait(timeout=2.0)


def test_nonpositive_interval_rejected():
    with pytest.raises(ValueError):
        Debouncer(lambda: None, 0)


# -- compression ----------------------------------------------------------------


def test_empty_input_round_trips():
    blob = compress(b"")
    assert blob[:4] == durability.BLOB_MAGIC
    assert decompress(blob) == b""


def test_repetitive_input_compresses_below_five_percent():
    data = b"\x42" * (1 << 20)
    assert len(compress(data)) < len(data) * 0.05


def test_bad_magic_rejected():
    with pytest.raises(CorruptBlobError):
        decompress(b"NOPE\x01\x01xxxx")


def test_bad_version_rejected():
    blob = compress(b"data")
    with pytest.raises(CorruptBlobError):
        decompress(blob[:4] + bytes([99]) + blob[5:])


def test_unknown_codec_rejected():
    blob = compress(b"data")
    with pytest.raises(CorruptBlobError):
        decompress(blob[:5] + bytes([9]) + blob[6:])


def test_truncated_blob_rejected():
    with pytest.raises(CorruptBlobError):
        decompress(b"QBL")


def test_corrupt_payload_rejected():
    blob = compress(b"some payload worth corrupting")
    with pytest.raises(CorruptBlobError):
        decompress(blob[:-4] + b"\x00\x00\x00\x00")


@given(st.binary(max_size=2048))
def test_compress_round_trip(data):
    assert decompress(compress(data)) == data


# -- snapshot save/load ------------------------------------------------------------


def test_save_load_empty_index(tmp_path):
    index = make_index(shards=2)
    save_index(tmp_path, index.meta, index.inverted, index.documents)
    loaded = load_all(tmp_path)
    assert len(loaded) == 1
    meta, inverted, documents = loaded[0]
    assert meta == index.meta
    assert inverted == index.inverted
    assert documents == index.documents


def test_save_load_round_trips_full_index(tmp_path):
    index = make_index(shards=3)
    for i in range(40):
        index.add(
            "doc",
            {"notes": f"word{i % 7} shared", "score": float(i % 10)},
            f"id-{i}",
        )
    save_index(tmp_path, index.meta, index.inverted, index.documents)
    meta, inverted, documents = load_all(tmp_path)[0]
    assert inverted == index.inverted
    assert documents == index.documents


def test_serialization_is_deterministic(tmp_path):
    index = make_index(shards=2)
    for i in range(10):
        index.add("doc", {"notes": f"w{i}"}, f"id-{i}")
    save_index(tmp_path, index.meta, index.inverted, index.documents)
    first = {
        p.relative_to(tmp_path): p.read_bytes()
        for p in sorted(tmp_path.rglob("*.bin"))
    }
    meta, inverted, documents = load_all(tmp_path)[0]
    save_index(tmp_path, meta, inverted, documents)
    second = {
        p.relative_to(tmp_path): p.read_bytes()
        for p in sorted(tmp_path.rglob("*.bin"))
    }
    assert first == second


def test_load_all_empty_root(tmp_path):
    assert load_all(tmp_path / "nothing-here") == []
    assert load_all(tmp_path) == []


def test_directory_without_meta_is_skipped(tmp_path):
    (tmp_path / "junk").mkdir()
    assert load_all(tmp_path) == []


def test_corrupt_shard_rejects_only_that_index(tmp_path):
    good = Index(make_meta(shards=1, name="good"))
    good.add("doc", {"notes": "fine"}, "1")
    bad = Index(make_meta(shards=1, name="bad"))
    bad.add("doc", {"notes": "doomed"}, "1")
    save_index(tmp_path, good.meta, good.inverted, good.documents)
    save_index(tmp_path, bad.meta, bad.inverted, bad.documents)
    (tmp_path / "bad" / "doc" / "inv_0.bin").write_bytes(b"garbage")
    loaded = load_all(tmp_path)
    assert [meta.name for meta, _, _ in loaded] == ["good"]


def test_meta_json_is_pretty_printed(tmp_path):
    index = make_index()
    save_index(tmp_path, index.meta, index.inverted, index.documents)
    text = (tmp_path / "idx" / "meta.json").read_text()
    assert json.loads(text)["name"] == "idx"
    assert "\n" in text  # human-readable, not minified
