import numpy as np
import pytest

from signdigit import model_io, nn, synth
from signdigit.train import TrainConfig, fit

# filled by test_acceptance.criterion(); echoed after the run so the
# per-criterion verdicts survive pytest's output capture
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


def tiny_spec(num_classes: int = 4, side: int = 8, filters: int = 2) -> nn.NetworkSpec:
    """Small conv net used for gradient checks: conv-relu-pool-flatten-dense-softmax."""
    return nn.NetworkSpec(
        layers=(
            nn.LayerSpec.conv(filters),
            nn.LayerSpec.relu(),
            nn.LayerSpec.pool(),
            nn.LayerSpec.flatten(),
            nn.LayerSpec.dense(num_classes),
            nn.LayerSpec.softmax(),
        ),
        input_shape=(1, side, side),
    )


@pytest.fixture(scope="session")
def fixture_digits():
    """One glyph per digit, used for memorization-based end-to-end tests."""
    rng = np.random.default_rng(5)
    imgs = np.stack([synth.glyph_image(d, rng) for d in range(10)])
    return imgs, np.arange(10)


@pytest.fixture(scope="session")
def overfit_model(fixture_digits):
    """Default architecture (dropout disabled) memorizing the 10 fixture glyphs."""
    imgs, labels = fixture_digits
    spec = nn.default_architecture(dropout_rates=(0.0, 0.0))
    config = TrainConfig(epochs=60, batch_size=10, seed=3, augment=False)
    params, history = fit(spec, ((imgs, labels), (imgs, labels)), config)
    assert history[-1].val_acc == 1.0, "fixture model failed to memorize"
    return spec, params


@pytest.fixture(scope="session")
def overfit_model_file(overfit_model, tmp_path_factory):
    spec, params = overfit_model
    path = tmp_path_factory.mktemp("model") / "overfit.sdb"
    model_io.save_model(spec, params, path)
    return path
