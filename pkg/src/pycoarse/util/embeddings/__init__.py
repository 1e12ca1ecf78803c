from .main import (HilbertEmbedding, CompressionProfile, ExpanderCertificate,
                   distance_row_kernel, embedding_from_negative_type, negative_type_from_embedding,
                   compression_bounds, expander_obstruction)

__all__ = ["HilbertEmbedding","CompressionProfile","ExpanderCertificate",
           "distance_row_kernel","embedding_from_negative_type","negative_type_from_embedding",
           "compression_bounds","expander_obstruction"]
