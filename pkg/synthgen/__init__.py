from synthgen.generator import SynthCorpus, generate, write_corpus

__all__ = ["SynthCorpus", "generate", "write_corpus"]
