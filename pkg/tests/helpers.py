"""Random valid witnessed families for property tests."""
from vclab.core import Family, mask_of
from vclab.vc import ShatteredMemberError, select_witnesses


def random_witnessed(rng, n, d, tries=40):
    """Grow a family by random (d+1)-sets, keeping each only if no member becomes shattered."""
    masks = set()
    for _ in range(tries):
        cand = mask_of(rng.sample(range(1, n + 1), d + 1))
        trial = sorted(masks | {cand})
        try:
            select_witnesses(Family.from_masks(n, trial, d + 1), d)
        except ShatteredMemberError:
            continue
        masks.add(cand)
    return select_witnesses(Family.from_masks(n, sorted(masks), d + 1), d)
