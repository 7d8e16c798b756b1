"""Stattest tests."""

from .test_chain import ChainTestCase
from .test_cli import CliTestCase
from .test_config import ConfigTestCase
from .test_exact import ExactTestCase
from .test_hardness import HardnessTestCase
from .test_model import ModelTestCase
from .test_numkit import NumkitTestCase
from .test_oracle import OracleTestCase
from .test_robust import RobustTestCase
from .test_serialization import SerializationTestCase
from .test_train import TrainTestCase


class DefaultTestCase(
    ChainTestCase,
    CliTestCase,
    ConfigTestCase,
    ExactTestCase,
    HardnessTestCase,
    ModelTestCase,
    NumkitTestCase,
    OracleTestCase,
    RobustTestCase,
    SerializationTestCase,
    TrainTestCase,
):
    """Base class for all tests. Integrations should inherit this test case."""
