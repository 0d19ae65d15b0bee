import numpy as np
import pytest

from revdict.data import Dataset, Entry


def make_entries(n, d, b, rng, with_gloss=False):
    entries = []
    for i in range(n):
        entries.append(Entry(
            word=f"word{i}",
            gloss=f"gloss {i}" if with_gloss else "",
            def_emb=rng.normal(size=d),
            word_emb=rng.normal(size=b),
        ))
    return entries


def make_dataset(n, d, b, seed=0, with_gloss=False):
    rng = np.random.default_rng(seed)
    return Dataset(entries=make_entries(n, d, b, rng, with_gloss),
                   d=d, b=b, source_tags=["synthetic"])


@pytest.fixture
def tiny_dataset():
    return make_dataset(20, 8, 8, seed=1)
