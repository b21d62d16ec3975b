"""Zero-table production, verification, and persistence."""

import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shankslab.engine import ACCURATE_PARAMS, PIPELINE_PARAMS, TWO_PI
from shankslab.batch import hardy_values
from shankslab.errors import (DomainError, MissedZeroError, TableFormatError)
from shankslab.zeros import (Zero, ZeroTable, _block_brackets, _gram_points,
                             count_zeros_rvm, export_zeros, find_zeros,
                             gram_point, import_zeros, verify_table)

# frozen from the 30-digit reference implementation
GRAM_MINUS1 = 9.6669080561301921413
GRAM_0 = 17.845599540410860817
GRAM_1 = 23.170282701246309279
GRAM_1000 = 1421.2563890327501587
GRAM_100000 = 74921.895130070669309
GAMMA_1 = 14.134725141734695
GAMMA_10 = 49.7738324776723
GAMMA_25 = 88.8091112076344654
GAMMA_1000 = 1419.42248094599569
GAMMA_1001 = 1420.41652632375114


@pytest.fixture(scope="session")
def table_1000():
    return find_zeros(1000)


class TestGramPoints:
    def test_frozen_values(self):
        # the phase series has its accuracy floor below t = 10, so the
        # k = -1 point carries a few 1e-13 of it
        assert abs(gram_point(-1) - GRAM_MINUS1) < 1e-9
        assert abs(gram_point(0) - GRAM_0) < 5e-12
        assert abs(gram_point(1) - GRAM_1) < 5e-12
        assert abs(gram_point(1000) - GRAM_1000) < 5e-10
        assert abs(gram_point(100000) - GRAM_100000) < 5e-8

    def test_phase_residual(self):
        from shankslab.engine import theta
        for k in (0, 7, 123, 4567):
            assert abs(theta(gram_point(k)) - k * np.pi) < 1e-8

    def test_monotone(self):
        g = _gram_points(np.arange(-1, 300, dtype=np.float64))
        assert float(np.diff(g).min()) > 0.0

    def test_below_range_rejected(self):
        with pytest.raises(DomainError):
            gram_point(-2)


class TestSmoothCount:
    def test_count_to_100_matches_sign_changes(self):
        # independent oracle: count sign changes of Z on a fine grid
        grid = np.linspace(TWO_PI + 1e-3, 100.0, 40000)
        z = hardy_values(grid, PIPELINE_PARAMS)
        changes = int(np.count_nonzero(np.signbit(z[:-1]) != np.signbit(z[1:])))
        assert changes == 29
        assert round(count_zeros_rvm(100.0)) == 29

    @given(t=st.floats(20.0, 1e5), dt=st.floats(0.5, 100.0))
    def test_increasing(self, t, dt):
        if t + dt > 1e5:
            return
        assert count_zeros_rvm(t + dt) > count_zeros_rvm(t)

    def test_domain(self):
        with pytest.raises(DomainError):
            count_zeros_rvm(9.0)


class TestFindZeros:
    def test_first_ordinate(self):
        tab = find_zeros(1)
        z = tab.entries[0]
        assert abs(z.gamma - GAMMA_1) < 1e-9
        assert z.residual <= 1e-8
        assert z.index == 1 and z.source == "computed"

    def test_tenth_ordinate(self):
        tab = find_zeros(10)
        assert abs(tab.entries[9].gamma - GAMMA_10) < 1e-9

    def test_table_structure(self, table_1000):
        g = table_1000.gammas
        assert g.size == 1000
        assert float(np.diff(g).min()) > 0.0
        assert [z.index for z in table_1000.entries] == \
            list(range(1, 1001))
        assert max(z.residual for z in table_1000.entries) <= 1e-8
        assert abs(g[-1] - GAMMA_1000) < 1e-9

    def test_t_max_in_final_gap(self, table_1000):
        t_max = table_1000.t_max
        assert table_1000.gammas[-1] < t_max < GAMMA_1001
        assert round(count_zeros_rvm(t_max)) == 1000

    def test_direct_route_agrees(self):
        tab_m = find_zeros(25)
        tab_d = find_zeros(25, refine="direct")
        dg = max(abs(a.gamma - b.gamma)
                 for a, b in zip(tab_m.entries, tab_d.entries))
        assert dg < 1e-9
        assert abs(tab_d.entries[24].gamma - GAMMA_25) < 1e-9

    def test_scan_step_stability(self):
        a = find_zeros(50)
        b = find_zeros(50, min_level=3)
        c = find_zeros(50, ACCURATE_PARAMS)
        for other in (b, c):
            dg = max(abs(x.gamma - y.gamma)
                     for x, y in zip(a.entries, other.entries))
            assert dg < 1e-9

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            find_zeros(0)
        with pytest.raises(DomainError):
            find_zeros(200_001)
        with pytest.raises(DomainError):
            find_zeros(2.5)
        with pytest.raises(DomainError):
            find_zeros(5, refine="psychic")
        with pytest.raises(DomainError):
            find_zeros(5, min_level=0)

    def test_count_beyond_height_ceiling(self):
        with pytest.raises(DomainError, match="supported height"):
            find_zeros(195_000)

    def test_cache_resume_is_bitwise(self, tmp_path):
        d = str(tmp_path)
        t1 = find_zeros(120, cache_dir=d)
        files = sorted(os.listdir(d))
        assert files
        t2 = find_zeros(120, cache_dir=d)
        os.remove(os.path.join(d, files[0]))
        t3 = find_zeros(120, cache_dir=d)
        g1 = [z.gamma for z in t1.entries]
        assert g1 == [z.gamma for z in t2.entries]
        assert g1 == [z.gamma for z in t3.entries]


class TestVerifyTable:
    def test_computed_table_passes(self, table_1000):
        rep = verify_table(table_1000)
        assert rep.passed and rep.first_failure is None
        assert any("checkpoint 316" in c for c in rep.checks)

    def test_deleted_entry_fails_first_affected_checkpoint(self,
                                                           table_1000):
        ent = list(table_1000.entries)
        kept = ent[:499] + ent[500:]
        kept = tuple(Zero(i + 1, z.gamma, z.residual, z.source)
                     for i, z in enumerate(kept))
        rep = verify_table(ZeroTable(entries=kept,
                                     t_max=table_1000.t_max))
        assert not rep.passed
        assert "checkpoint 999" in rep.first_failure

    def test_swapped_pair_fails_monotonicity(self, table_1000):
        ent = list(table_1000.entries)
        a, b = ent[100], ent[101]
        ent[100] = Zero(101, b.gamma, b.residual, b.source)
        ent[101] = Zero(102, a.gamma, a.residual, a.source)
        rep = verify_table(ZeroTable(entries=tuple(ent),
                                     t_max=table_1000.t_max))
        assert not rep.passed
        assert "strictly increasing" in rep.first_failure

    def test_corrupted_ordinate_fails_recompute(self, table_1000):
        ent = list(table_1000.entries)
        z = ent[500]
        ent[500] = Zero(z.index, z.gamma + 0.01, z.residual, z.source)
        rep = verify_table(ZeroTable(entries=tuple(ent),
                                     t_max=table_1000.t_max))
        assert not rep.passed
        assert "recomputed |Z|" in rep.first_failure

    def test_oversized_residual_fails(self, table_1000):
        ent = list(table_1000.entries)
        z = ent[3]
        ent[3] = Zero(z.index, z.gamma, 1e-5, z.source)
        rep = verify_table(ZeroTable(entries=tuple(ent),
                                     t_max=table_1000.t_max))
        assert not rep.passed
        assert "stored residuals" in rep.first_failure

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            verify_table(ZeroTable(entries=(), t_max=0.0))

    def test_explicit_ladder(self, table_1000):
        assert verify_table(table_1000, ladder=[50]).passed
        with pytest.raises(DomainError):
            verify_table(table_1000, ladder=[0])
        rep = verify_table(table_1000, ladder=[5000])
        assert rep.passed
        assert any(c.startswith("SKIP") and "5000" in c for c in rep.checks)

    @given(c=st.integers(5, 995))
    def test_any_checkpoint_count_is_consistent(self, c, table_1000):
        assert verify_table(table_1000, ladder=[c]).passed


class TestScanLadder:
    def test_missed_zero_reports_block(self):
        grams = np.array([100.0, 101.0, 102.0])

        def never_changes(ts):
            return np.ones_like(np.asarray(ts, dtype=np.float64))

        with pytest.raises(MissedZeroError) as exc:
            _block_brackets(never_changes, grams, 500, 0, 2, 1)
        err = exc.value
        assert err.expected == 2 and err.found == 0
        assert err.block == (100.0, 102.0)
        assert "500..502" in str(err)


@pytest.fixture(scope="module")
def small_table():
    return find_zeros(40)


class TestPersistence:
    def test_binary_round_trip(self, small_table, tmp_path):
        p = tmp_path / "t.ztbl"
        export_zeros(small_table, p, "binary")
        back = import_zeros(p, "binary")
        assert [z.gamma for z in back.entries] == \
            [z.gamma for z in small_table.entries]
        assert back.t_max == small_table.t_max
        assert all(z.source == "imported" for z in back.entries)
        assert max(z.residual for z in back.entries) <= 1e-6
        assert verify_table(back).passed

    def test_text_round_trip(self, small_table, tmp_path):
        p = tmp_path / "t.txt"
        export_zeros(small_table, p, "plain-text")
        back = import_zeros(p, "plain-text")
        assert [z.gamma for z in back.entries] == \
            [z.gamma for z in small_table.entries]
        assert back.t_max == small_table.t_max

    def test_text_without_t_max_defaults_to_last(self, small_table,
                                                 tmp_path):
        p = tmp_path / "bare.txt"
        with open(p, "w") as fh:
            for z in small_table.entries:
                fh.write(f"{z.gamma:.17g}\n")
        back = import_zeros(p, "plain-text")
        assert back.t_max == small_table.entries[-1].gamma
        assert verify_table(back).passed

    def test_non_numeric_line_named(self, small_table, tmp_path):
        p = tmp_path / "bad.txt"
        lines = [f"{z.gamma:.17g}" for z in small_table.entries]
        lines.insert(6, "twenty-one-ish")
        with open(p, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with pytest.raises(TableFormatError) as exc:
            import_zeros(p, "plain-text")
        assert exc.value.line == 7

    def test_descending_text_named(self, tmp_path):
        p = tmp_path / "desc.txt"
        with open(p, "w") as fh:
            fh.write("21.022039638771554\n14.134725141734695\n")
        with pytest.raises(TableFormatError) as exc:
            import_zeros(p, "plain-text")
        assert exc.value.line == 2

    def test_truncated_binary_names_offset(self, small_table, tmp_path):
        p = tmp_path / "t.ztbl"
        export_zeros(small_table, p, "binary")
        data = p.read_bytes()
        cut = tmp_path / "cut.ztbl"
        cut.write_bytes(data[:len(data) - 13])
        with pytest.raises(TableFormatError) as exc:
            import_zeros(cut, "binary")
        assert exc.value.offset == len(data) - 13

    def test_bad_magic_and_version(self, small_table, tmp_path):
        p = tmp_path / "t.ztbl"
        export_zeros(small_table, p, "binary")
        data = bytearray(p.read_bytes())
        wrong = tmp_path / "w.ztbl"
        wrong.write_bytes(b"NOPE" + bytes(data[4:]))
        with pytest.raises(TableFormatError) as exc:
            import_zeros(wrong, "binary")
        assert exc.value.offset == 0
        data[4] = 9
        wrong.write_bytes(bytes(data))
        with pytest.raises(TableFormatError) as exc:
            import_zeros(wrong, "binary")
        assert exc.value.offset == 4

    def test_empty_text_rejected(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("# nothing here\n")
        with pytest.raises(TableFormatError):
            import_zeros(p, "plain-text")

    def test_unknown_format(self, small_table, tmp_path):
        with pytest.raises(DomainError):
            export_zeros(small_table, tmp_path / "x", "json")
        with pytest.raises(DomainError):
            import_zeros(tmp_path / "x", "json")
