import numpy as np
import pytest

from ionqec import circuit, codes, dem, noise, registry
from ionqec.decoder import BpOsdDecoder, DecoderConfig


@pytest.fixture(scope="session")
def surface3():
    return registry.build("surface-3")


@pytest.fixture(scope="session")
def bb5_30():
    return registry.build("bb5-30-4-5")


@pytest.fixture(scope="session")
def bb5_48():
    return registry.build("bb5-48-4-7")


def memory_dem(code, basis, rounds, n_a, p=1e-3, tau_m=30.0):
    circ = circuit.build_memory_experiment(code, basis, rounds, n_a)
    return circ, dem.compile_dem(circ, noise.annotate(circ, noise.NoiseParams(p, tau_m)))


@pytest.fixture(scope="session")
def surface3_z_dem(surface3):
    return memory_dem(surface3, "Z", 3, 4)


@pytest.fixture(scope="session")
def bb5_30_z_dem(bb5_30):
    return memory_dem(bb5_30, "Z", 5, 5)


def singles_all_correct(d, config=None):
    """Indices of single-mechanism faults whose observables decode wrongly."""
    dec = BpOsdDecoder(d, config or DecoderConfig(max_bp_iters=200))
    bad = []
    for i in range(len(d)):
        syn = np.zeros(d.n_detectors, dtype=np.uint8)
        for b in d.dets[i]:
            syn[b] = 1
        r = dec.decode(syn)
        truth = np.zeros(d.n_observables, dtype=np.uint8)
        for o in d.obss[i]:
            truth[o] = 1
        if not np.array_equal(r.predicted_observables, truth):
            bad.append(i)
    return bad
