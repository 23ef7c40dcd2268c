import setuptools
import os

_version_ns = {}
with open(os.path.join(os.path.dirname(os.path.abspath(__file__)), "malstein", "__version__.py")) as fh:
    exec(fh.read(), _version_ns)
__version__ = _version_ns["__version__"]

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="malstein",
    version=__version__,
    description="Exact Malliavin-Stein bounds and distances to the normal law on finite product spaces.",
    packages=setuptools.find_packages(include=["malstein", "malstein.*"]),
    entry_points={"console_scripts": ["malstein-run=malstein.malstein_run:main"]},
    long_description=long_description,
    long_description_content_type="text/markdown",
    zip_safe=False,
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "License :: OSI Approved :: GNU Lesser General Public License v3 or later (LGPLv3+)",
        "Operating System :: OS Independent",
    ],
    install_requires=["numpy", "scipy>=1.12", "pyyaml", "tqdm", "networkx"],
)
