"""Audio-to-audio emotion style transfer at desk scale.

Speech is factored into per-frame content tokens, an emotion-agnostic
speaker vector and speaker-agnostic emotion embeddings; an F0 contour is
predicted from the three by cross-attention; a decoder plus a deterministic
harmonic/noise synthesizer reconstructs audio.  Swapping only the emotion
embeddings of a reference utterance converts its emotion onto the source.
"""

__version__ = "0.1.0"
