from setuptools import setup, find_packages

setup(
  name="graded_polarisation",
  version="0.1.0",
  packages=find_packages(exclude=["tests"]),
  install_requires=[
    "python-dotenv==1.0.0",
    "sympy>=1.12",
  ],
  python_requires=">=3.8",
)
