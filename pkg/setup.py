from setuptools import setup, find_packages

# Read the contents of your README file
with open("README.md", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="qoentropy",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "qoentropy=src.qoentropy:main",
        ],
    },
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
    ],
    python_requires=">=3.8",
    description="Observational entropy with quantum reference priors, with seeded numerical verification",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    keywords="observational entropy, quantum information, retrodiction, petz map, relative entropy",
)
