from typing import Dict, List, Sequence

import numpy as np


class BlockLayout:
    """Coordinates of l2(G/N, C^d): coset block i occupies [i*d, (i+1)*d)."""

    def __init__(self, n_blocks: int, block_dim: int):
        self.n_blocks = n_blocks
        self.block_dim = block_dim
        self.index_map: Dict[int, np.ndarray] = {
            i: np.arange(block_dim) + i * block_dim for i in range(n_blocks)
        }

    @property
    def dim(self) -> int:
        return self.n_blocks * self.block_dim

    def block(self, i: int) -> slice:
        return slice(i * self.block_dim, (i + 1) * self.block_dim)

    def flatten(self, blocks: Sequence) -> np.ndarray:
        if len(blocks) != self.n_blocks:
            raise ValueError(f"Expected {self.n_blocks} blocks, but found {len(blocks)}")
        return np.concatenate([np.asarray(b, dtype=complex).reshape(self.block_dim) for b in blocks])

    def unflatten(self, vector) -> List[np.ndarray]:
        vector = np.asarray(vector)
        if vector.shape != (self.dim,):
            raise ValueError(f"Expected a vector of length {self.dim}, but found shape {vector.shape}")
        return [vector[idx] for idx in self.index_map.values()]

    def __repr__(self):
        return f"<BlockLayout {self.n_blocks} x C^{self.block_dim}>"
