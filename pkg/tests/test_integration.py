"""
End-to-end test of hktkit on the R x h7 family.

This test exercises the engine in a single flow:
1. Sweep the family over several parameters concurrently
2. Check h^{0,1} and the verdict of every item
3. Run the full report at t = 1/2 and check its sections
4. Run the full report at t = 1/3 and check the obstruction witness
5. Re-check the del del_J-lemma against the parity of h^{0,1}

    Note: the full reports take a few seconds each.
"""

import pytest

from hktkit import HktkitClient, sweep
from hktkit.core.codec import dumps
from hktkit.core.exterior import scalar


FAMILY = ["1/4", "1/3", "1/2", "2/3", "3/4"]
EXPECTED_H01 = [3, 3, 4, 3, 3]
EXPECTED_VERDICTS = ["no", "no", "yes", "no", "no"]


@pytest.mark.asyncio
async def test_complete_family_flow():
    """Complete end-to-end flow over the R x h7 family."""
    print("\n=== Starting R x h7 Family Test ===\n")

    # Step 1: Sweep the family, including one singular parameter
    print("Step 1: Sweeping the family...")
    results = await sweep(FAMILY + ["1"], command="hkt")

    assert [r.t for r in results] == FAMILY + ["1"], "Results should keep the input order"
    print(f"✓ {len(results)} sweep items finished\n")

    # Step 2: Check h01 and verdicts
    print("Step 2: Checking h01 and verdicts...")
    assert [r.h01 for r in results[:-1]] == EXPECTED_H01, "h01 should match the family values"
    assert [r.verdict for r in results[:-1]] == EXPECTED_VERDICTS, "Verdicts should follow the parity of h01"
    singular = results[-1]
    assert singular.report is None, "Singular parameter should not produce a report"
    assert singular.exit_code == 2, "Singular parameter is an input error"
    assert "singular parameter" in singular.error
    for r in results[:-1]:
        print(f"  - t = {r.t}: h01 = {r.h01}, verdict = {r.verdict}")
    print("✓ Verdicts match\n")

    # Step 3: Full report at t = 1/2
    print("Step 3: Running the full report at t = 1/2...")
    client = HktkitClient("rxh7", t="1/2")
    report = client.run("full")

    assert report.verdict.hkt_exists == "yes", "t = 1/2 should be HKT"
    assert report.hkt["hkt_form"] is not None, "An HKT form should be certified"
    assert report.cohomology["ddj_lemma"] is True, "del del_J-lemma should hold"
    assert report.cohomology["duality"].holds, "BC/AE duality should hold"
    assert report.cohomology["degree"].holds, "Degree sequence should be exact"
    assert report.qd["bicomplex_isomorphism"], "R should intertwine the differentials"
    assert report.qd["omega_correspondence"] == scalar(0, -1)
    assert report.qd["v_maps"].holds, "V-map checks should pass"
    assert report.consistency["stokes"], "Stokes should hold on a nilpotent algebra"
    assert report.consistency["verdict_coherence"], "Verdict should agree with the certificates"
    assert set(report.timings) >= {"validation", "cohomology", "qd", "hkt", "verdict", "consistency"}
    print(f"✓ Full report computed in {sum(report.timings.values()):.2f}s\n")

    # Step 4: Full report at t = 1/3
    print("Step 4: Running the full report at t = 1/3...")
    third = HktkitClient("rxh7", t="1/3")
    report = third.run("full")

    assert report.verdict.hkt_exists == "no", "t = 1/3 should not be HKT"
    assert report.verdict.witness is not None, "An obstruction witness should be attached"
    assert report.hkt["hkt_form"] is None, "No HKT form should be found"
    assert report.hkt["witness_positivity"].value == "semi"
    assert dumps(report.to_dict()) == dumps(third.run("full").to_dict()), "Reports should be deterministic"
    print("✓ Obstruction witness certified\n")

    # Step 5: del del_J-lemma against parity
    print("Step 5: Comparing the del del_J-lemma with parity...")
    for t, h01 in zip(FAMILY, EXPECTED_H01):
        lemma = HktkitClient("rxh7", t=t).cohomology.ddj_lemma_check()
        assert lemma.holds == (h01 % 2 == 0), f"Lemma at t = {t} should follow parity"
    print("✓ Lemma follows parity\n")

    print("=== All Family Tests Passed! ===\n")


@pytest.mark.asyncio
async def test_empty_sweep():
    assert await sweep([]) == []
