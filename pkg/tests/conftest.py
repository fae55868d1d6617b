import pytest

from lttflow import pipeline, verify


@pytest.fixture(scope="session")
def model_1d():
    """Reference 1-D Gaussian field, trained once per session."""
    model, history = verify.train_reference_1d()
    return model, history


@pytest.fixture(scope="session")
def digits():
    return pipeline.load_digits_dataset()


@pytest.fixture(scope="session")
def model_image(digits):
    """Reference image field, trained once per session."""
    model, _ = verify.train_reference_image(digits)
    return model
