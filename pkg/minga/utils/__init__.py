from .rng import make_rng, game_streams, genome_digest

__all__ = ["make_rng", "game_streams", "genome_digest"]
