import pytest

from utilflow.models import capital_aware, classical, hyperbolic


@pytest.fixture
def classical_model():
    return classical(0.1, t_max=10)


@pytest.fixture
def hyperbolic_model():
    return hyperbolic(0.3, t_max=10)


@pytest.fixture
def capital_model():
    return capital_aware(0.05, 0.1, 100, 0.02, t_max=5)


def builtin_models():
    return [
        classical(0.1, t_max=10),
        hyperbolic(0.3, t_max=10),
        capital_aware(0.05, 0.1, 100, 0.02, t_max=5),
    ]


@pytest.fixture(params=["classical", "hyperbolic", "capital_aware"])
def any_model(request):
    return {m.family.value: m for m in builtin_models()}[request.param]
