from textlab.data.batching import Batch, iter_evaluation_batches, make_buckets, pad_batch
from textlab.data.fields import (
    Field,
    IndexedInstance,
    IndexField,
    Instance,
    LabelField,
    MetadataField,
    SequenceLabelField,
    SpanField,
    TextField,
    index_instance,
)
from textlab.data.readers import (
    ClassificationReader,
    DatasetReader,
    InputError,
    PairClassificationReader,
    SpanSelectionReader,
    TaggingReader,
)
from textlab.data.tokenization import Token, tokenize
from textlab.data.vocabulary import (
    CHARACTERS_NAMESPACE,
    PADDING_ID,
    PADDING_TOKEN,
    TOKENS_NAMESPACE,
    UNKNOWN_ID,
    UNKNOWN_TOKEN,
    Vocabulary,
    build_vocabulary,
)

__all__ = [
    "Batch",
    "ClassificationReader",
    "DatasetReader",
    "Field",
    "IndexField",
    "IndexedInstance",
    "InputError",
    "Instance",
    "LabelField",
    "MetadataField",
    "PairClassificationReader",
    "SequenceLabelField",
    "SpanField",
    "SpanSelectionReader",
    "TaggingReader",
    "TextField",
    "Token",
    "Vocabulary",
    "build_vocabulary",
    "index_instance",
    "iter_evaluation_batches",
    "make_buckets",
    "pad_batch",
    "tokenize",
    "CHARACTERS_NAMESPACE",
    "PADDING_ID",
    "PADDING_TOKEN",
    "TOKENS_NAMESPACE",
    "UNKNOWN_ID",
    "UNKNOWN_TOKEN",
]
