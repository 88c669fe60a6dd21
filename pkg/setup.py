from setuptools import find_packages, setup

setup(
    name="stratakit",
    version="0.1.0",
    description="Directed stratifications, projective resolutions and homological dimension bounds for finite-dimensional algebras",
    packages=find_packages(include=["stratakit", "stratakit.*"]),
    package_data={"stratakit": ["fixtures/*.yaml", "fixtures/*.stk"]},
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.8.0",
        "pydantic-settings>=2.3.4",
        "eval_type_backport>=0.2.0; python_version < '3.10'",
        "PyYAML>=6.0.1",
        "prometheus-client>=0.20.0",
        "numpy>=1.24",
        "networkx>=3.1",
        "sympy>=1.12",
    ],
    extras_require={
        "dev": [
            "pytest>=8.2.0",
            "pytest-cov>=5.0.0",
        ]
    },
    entry_points={"console_scripts": ["stratakit = stratakit.main:main"]},
)
